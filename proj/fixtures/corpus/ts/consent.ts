export function recordConsent(store: ConsentStore, userId: string, choices: Record<string, boolean>) {
  const entry = { userId, choices, at: new Date().toISOString() };
  store.upsert(entry);
  telemetry.emit('consent', { granted: Object.keys(choices).length });
}
