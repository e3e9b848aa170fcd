type Coordinates = { latitude: number; longitude: number };

export class LocationService {
  private cache = new Map<string, Coordinates>();

  constructor(private readonly http: HttpClient) {}

  async currentLocation(deviceId: string): Promise<Coordinates> {
    const coords = await this.http.get<Coordinates>(`/devices/${deviceId}/location`);
    this.cache.set(deviceId, coords);
    return coords;
  }
}
