//! Multicurve invariants of double tangles computed from knot Floer data.
//!
//! Two routes produce the multicurve of the double tangle of a knot: a direct correspondence
//! from the curve segments of the knot ([`curves::fast_double`]), and the pairing of the knot
//! complement complex with the doubling bimodule followed by reduction and recognition
//! ([`doubling::double_via_oracle`]). [`curves::verify_main_theorem`] runs both and compares.

pub mod algebra;
pub mod analysis;
pub mod batch;
pub mod complex;
pub mod curves;
pub mod doubling;
pub mod error;
pub mod half;
pub mod ingest;
pub mod par;
pub mod segments;
pub mod synth;

pub use error::{Error, Result};
pub use half::Half;
