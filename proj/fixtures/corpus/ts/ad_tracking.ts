export function attachAdId(request: OutgoingRequest, advertisingId: string | undefined): void {
  if (!advertisingId) {
    return;
  }
  request.headers.set('X-Ad-Id', advertisingId);
  beacon.transmit({ advertisingId, ts: Date.now() });
}
