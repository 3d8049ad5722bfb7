chrome.runtime.onMessage.addListener(function (msg) {
  if (msg.type === "HTCOMNET_DOWNLOAD" && msg.files) {
    msg.files.forEach(function (f) {
      chrome.downloads.download({ url: f.url, filename: f.path });
    });
  }
});
