function runSnippet(code) {
  eval(code);
}

addEventListener("message", function (event) {
  var msg = event.data || {};
  if (msg.type === "getResumeInfo" && msg.context) {
    runSnippet(msg.context.contentScript);
  }
});
