addEventListener("message", function (event) {
  var request = event.data || {};
  if (request.type === "extensions") {
    chrome.runtime.sendMessage(request, function (response) {
      postMessage({ type: "extensions_result", data: response }, "*");
    });
  }
});
