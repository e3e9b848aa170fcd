function checkGeofence(currentLocation, fence) {
  const distance = geo.distance(currentLocation, fence.center);
  if (distance > fence.radius) {
    alerts.dispatch({ type: 'left-fence', at: currentLocation });
  }
  return distance;
}

module.exports = checkGeofence;
