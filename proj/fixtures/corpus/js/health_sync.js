export async function syncHeartRate(api, readings) {
  for (const r of readings) {
    const heartRate = Math.round(r.bpm);
    await api.post('/vitals', { heartRate, takenAt: r.timestamp });
  }
}
