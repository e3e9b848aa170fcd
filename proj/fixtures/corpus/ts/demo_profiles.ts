export const demoProfiles = [
  { name: 'Ada Example', email: 'ada@example.net', phone: '+1 415 555 0100' },
  { name: 'Bo Example', email: 'bo@example.net', phone: '+44 20 7946 0000' },
];

export function displayName(p: { name: string }): string {
  return p.name.trim();
}
