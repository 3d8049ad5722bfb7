addEventListener("message", function (event) {
  var msg = event.data || {};
  if (msg.Action === "GETCOOKIE" || msg.Action === "GET_BLOB") {
    chrome.runtime.sendMessage(msg, function (response) {
      postMessage({ Action: msg.Action + "_RESULT", data: response }, "*");
    });
  }
});
