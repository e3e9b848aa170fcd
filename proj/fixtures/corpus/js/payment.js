import Stripe from 'stripe';

const stripe = new Stripe(process.env.STRIPE_KEY);

export async function charge(order) {
  const cardNumber = order.payment.cardNumber;
  const cvv = order.payment.cvv;
  const token = await stripe.tokens.create({ card: { number: cardNumber, cvc: cvv } });
  console.log('charging card', maskCard(cardNumber));
  return stripe.charges.create({ amount: order.total, source: token.id });
}
