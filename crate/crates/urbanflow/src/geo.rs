//! WGS84 distance helpers.
//!
//! Edge lengths use the haversine great-circle distance. Point-to-node
//! snapping and rasterization use a local equirectangular approximation,
//! which is accurate to well under 0.1% at city scale.

/// Mean Earth radius in meters.
pub const EARTH_RADIUS_M: f64 = 6_371_000.0;

/// Great-circle distance in meters between two WGS84 points.
pub fn haversine_m(lon1: f64, lat1: f64, lon2: f64, lat2: f64) -> f64 {
    let (phi1, phi2) = (lat1.to_radians(), lat2.to_radians());
    let dphi = (lat2 - lat1).to_radians();
    let dlambda = (lon2 - lon1).to_radians();
    let a = (dphi / 2.0).sin().powi(2) + phi1.cos() * phi2.cos() * (dlambda / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_M * a.sqrt().asin()
}

/// Local planar projection around a reference latitude.
///
/// Maps degrees to meters so Euclidean distance in the projected plane
/// approximates ground distance near `ref_lat_deg`.
#[derive(Debug, Clone, Copy)]
pub struct LocalProjection {
    meters_per_deg_lon: f64,
    meters_per_deg_lat: f64,
}

impl LocalProjection {
    pub fn new(ref_lat_deg: f64) -> Self {
        let meters_per_deg_lat = EARTH_RADIUS_M * std::f64::consts::PI / 180.0;
        Self {
            meters_per_deg_lon: meters_per_deg_lat * ref_lat_deg.to_radians().cos(),
            meters_per_deg_lat,
        }
    }

    pub fn project(&self, lon: f64, lat: f64) -> (f64, f64) {
        (lon * self.meters_per_deg_lon, lat * self.meters_per_deg_lat)
    }

    pub fn distance_m(&self, lon1: f64, lat1: f64, lon2: f64, lat2: f64) -> f64 {
        let (x1, y1) = self.project(lon1, lat1);
        let (x2, y2) = self.project(lon2, lat2);
        ((x1 - x2).powi(2) + (y1 - y2).powi(2)).sqrt()
    }

    /// Degrees of longitude spanning `meters` at the reference latitude.
    pub fn lon_degrees(&self, meters: f64) -> f64 {
        meters / self.meters_per_deg_lon
    }

    /// Degrees of latitude spanning `meters`.
    pub fn lat_degrees(&self, meters: f64) -> f64 {
        meters / self.meters_per_deg_lat
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn haversine_zero_for_identical_points() {
        assert_eq!(haversine_m(114.3, 30.6, 114.3, 30.6), 0.0);
    }

    #[test]
    fn haversine_one_degree_latitude() {
        // One degree of latitude is ~111.2 km on the sphere.
        let d = haversine_m(0.0, 0.0, 0.0, 1.0);
        assert!((d - 111_194.9).abs() < 10.0, "got {d}");
    }

    #[test]
    fn equirectangular_close_to_haversine_at_city_scale() {
        let proj = LocalProjection::new(30.6);
        let h = haversine_m(114.30, 30.60, 114.35, 30.62);
        let e = proj.distance_m(114.30, 30.60, 114.35, 30.62);
        assert!((h - e).abs() / h < 1e-3, "haversine {h} vs equirect {e}");
    }
}
