// Maintainer: Dana Whitfield <dana.whitfield@example.org>
const DEFAULT_SENDER = 'newsletter@example.com';

export function subscribe(list, email) {
  if (!email.includes('@')) {
    throw new Error('invalid address');
  }
  list.add(email);
  return mailer.post('/subscriptions', { email, from: DEFAULT_SENDER });
}
