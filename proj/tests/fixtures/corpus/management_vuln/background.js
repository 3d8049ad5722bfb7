chrome.runtime.onMessage.addListener(function (request, sender, sendResponse) {
  if (request.type === "extensions" && request.act === "get_all") {
    chrome.management.getAll(sendResponse);
    return true;
  }
});
