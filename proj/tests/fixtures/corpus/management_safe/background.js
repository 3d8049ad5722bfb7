chrome.runtime.onMessageExternal.addListener(function (msg, sender, sendResponse) {
  if (msg.act === "get_all") {
    chrome.management.getAll(sendResponse);
    return true;
  }
});
