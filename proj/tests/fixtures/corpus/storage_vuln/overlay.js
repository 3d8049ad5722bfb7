addEventListener("message", function (event) {
  var msg = event.data || {};
  if (msg.owner !== "VisualSP") {
    return;
  }
  if (msg.command === "SetUserId") {
    chrome.storage.local.set({ userId: msg.data });
  }
  if (msg.command === "GetUserId") {
    chrome.storage.local.get("userId", function (items) {
      postMessage({ owner: "VisualSP", userId: items.userId }, "*");
    });
  }
});
