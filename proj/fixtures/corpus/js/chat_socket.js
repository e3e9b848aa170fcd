module.exports = function attach(io, store) {
  io.on('connection', (socket) => {
    const ipAddress = socket.handshake.address;
    socket.on('message', async (msg) => {
      const entry = { from: socket.id, ipAddress, text: msg.text };
      await store.save(entry);
      io.emit('message', { from: socket.id, text: msg.text });
    });
  });
};
