//! Complex gamma function and Pochhammer symbols.
//!
//! Gamma uses the Lanczos approximation with the 15-coefficient set for
//! g = 607/128 (Pugh's optimal choice for this order; relative accuracy well
//! below 1e-13 on the right half plane), with the reflection formula for
//! Re(z) < 1/2.

use num_complex::Complex64;

const LANCZOS_G: f64 = 607.0 / 128.0;

/// Lanczos coefficients for g = 607/128, n = 15.
const LANCZOS_COEFFS: [f64; 15] = [
    0.999_999_999_999_997,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_746,
    -0.491_913_816_097_620_2,
    3.399_464_998_481_188e-5,
    4.652_362_892_704_858e-5,
    -9.837_447_530_487_956e-5,
    1.580_887_032_249_125e-4,
    -2.102_644_417_241_048_8e-4,
    2.174_396_181_152_126_5e-4,
    -1.643_181_065_367_639e-4,
    8.441_822_398_385_274e-5,
    -2.619_083_840_158_140_5e-5,
    3.689_918_265_953_162_5e-6,
];

/// Gamma function for complex argument.
pub fn gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // reflection: gamma(z) = pi / (sin(pi z) gamma(1-z))
        let pi = std::f64::consts::PI;
        return pi / ((pi * z).sin() * gamma(Complex64::new(1.0, 0.0) - z));
    }
    let zm1 = z - 1.0;
    let mut acc = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (zm1 + i as f64);
    }
    let t = zm1 + LANCZOS_G + 0.5;
    let sqrt_two_pi = (2.0 * std::f64::consts::PI).sqrt();
    sqrt_two_pi * t.powc(zm1 + 0.5) * (-t).exp() * acc
}

/// Gamma for real argument.
pub fn gamma_real(x: f64) -> f64 {
    gamma(Complex64::new(x, 0.0)).re
}

/// Rising factorial `(a)_m = a (a+1) ... (a+m-1)` for complex `a`.
pub fn pochhammer(a: Complex64, m: usize) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for k in 0..m {
        acc *= a + k as f64;
    }
    acc
}

/// Rising factorial for real argument.
pub fn pochhammer_real(a: f64, m: usize) -> f64 {
    (0..m).fold(1.0, |acc, k| acc * (a + k as f64))
}

pub fn factorial(m: usize) -> f64 {
    (1..=m).fold(1.0, |acc, k| acc * k as f64)
}
