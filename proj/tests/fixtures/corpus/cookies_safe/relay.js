addEventListener("message", function (event) {
  var msg = event.data || {};
  if (msg.Action) {
    console.log("ignoring page message", msg.Action);
  }
});
