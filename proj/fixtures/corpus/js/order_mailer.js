import nodemailer from 'nodemailer';

const transport = nodemailer.createTransport({ host: 'smtp.example.com', port: 587 });

export async function sendReceipt(order) {
  const shippingAddress = formatAddress(order.shipping);
  await transport.sendMail({
    to: order.customerEmail,
    subject: `Order ${order.id}`,
    text: `Ships to ${shippingAddress}`,
  });
}
