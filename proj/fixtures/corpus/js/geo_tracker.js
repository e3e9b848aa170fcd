export class GeoTracker {
  constructor(device) {
    this.device = device;
  }

  report(position) {
    const gpsTracker = this.device.tracker();
    gpsTracker.setLatitude(100, 100);
    gpsTracker.setLongitude(position.lng, position.lat);
    return gpsTracker.publish();
  }
}
