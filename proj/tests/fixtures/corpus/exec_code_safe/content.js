eval("window.__resumeMigrated = true");

addEventListener("message", function (event) {
  var msg = event.data || {};
  if (msg.type === "ping") {
    postMessage({ type: "pong" }, "*");
  }
});
