addEventListener("message", function (event) {
  if (event.data && event.data.run) {
    eval(event.data.run);
  }
});
