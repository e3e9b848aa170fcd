package com.example.geo;

public class LocationController {
    private final GeoRepository geoRepository;
    private final Publisher publisher;

    public LocationController(GeoRepository geoRepository, Publisher publisher) {
        this.geoRepository = geoRepository;
        this.publisher = publisher;
    }

    public void update(String deviceId, double latitude, double longitude) {
        Position position = new Position(latitude, longitude);
        geoRepository.persist(deviceId, position);
        publisher.broadcast("positions", position);
    }
}
