//! Complex values on the wire as `{ "re": .., "im": .. }`.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Serialize, Deserialize)]
struct ReIm {
    re: f64,
    im: f64,
}

pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    ReIm { re: z.re, im: z.im }.serialize(s)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
    let ReIm { re, im } = ReIm::deserialize(d)?;
    Ok(Complex64::new(re, im))
}

/// Wrapper for places where a bare complex value needs its own `Serialize`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Wire(#[serde(with = "crate::serde_complex")] pub Complex64);
