//! Float helpers that work without `std`.

pub(crate) use num_traits::Float;

/// `sinh(z) / z` for real `z`, accurate near zero.
pub(crate) fn sinhc(z: f64) -> f64 {
    if z.abs() < 1e-4 {
        let z2 = z * z;
        1.0 + z2 / 6.0 * (1.0 + z2 / 20.0)
    } else {
        z.sinh() / z
    }
}

/// `sin(z) / z`, accurate near zero.
pub(crate) fn sinc(z: f64) -> f64 {
    if z.abs() < 1e-4 {
        let z2 = z * z;
        1.0 - z2 / 6.0 * (1.0 - z2 / 20.0)
    } else {
        z.sin() / z
    }
}

/// Wrap an angle into `(-π, π]`.
pub(crate) fn wrap_pi(x: f64) -> f64 {
    use core::f64::consts::PI;
    let two_pi = 2.0 * PI;
    let mut y = x - two_pi * ((x + PI) / two_pi).floor();
    if y <= -PI {
        y += two_pi;
    }
    y
}
