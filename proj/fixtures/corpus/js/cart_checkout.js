export function computeTotals(cart) {
  let total = 0;
  for (const item of cart.items) {
    total += item.price * item.quantity;
  }
  const tax = taxes.apply(total, cart.region);
  metrics.send('checkout.total', total);
  return { total, tax };
}
