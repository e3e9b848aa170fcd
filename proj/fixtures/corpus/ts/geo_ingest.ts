interface Ping { deviceId: string; lat: number; lng: number }

export async function ingest(pings: Ping[], db: Database): Promise<number> {
  let stored = 0;
  for (const ping of pings) {
    const geohash = encodeGeohash(ping.lat, ping.lng, 9);
    await db.execute('INSERT INTO pings VALUES (?, ?)', [ping.deviceId, geohash]);
    stored++;
  }
  return stored;
}
