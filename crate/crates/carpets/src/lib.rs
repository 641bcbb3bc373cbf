//! Exact arithmetic for self-similar carpets over finite fields.
//!
//! A carpet is the p^d x p^d table of the double sequence
//! a(i, j) = a(i-1, j) + m * a(i-1, j-1) + a(i, j-1) with border values 1,
//! computed over GF(p^k).  The crate generates carpets by three independent
//! routes, analyzes their zero sets and symmetries, factors them into finite
//! tile systems, renders them as portable bitmap and pixmap images, and
//! bundles a verification suite that sweeps the underlying identities over
//! configurable parameter ranges.
//!
//! Entry points:
//!
//! * [`field::FieldSpec`] describes GF(p^k) and parses descriptors such as
//!   `"7"`, `"3^2"`, or `"19^2/1,0,1"`.
//! * [`carpet`] generates matrices by recurrence, tensor product, or the
//!   per-entry digit oracle, and handles the text format.
//! * [`analysis`] classifies symmetries, reports zero sets, computes box
//!   dimensions, and scans whole fields for multipliers with zeros.
//! * [`tiling`] builds the finite tile catalog of a carpet family and
//!   reassembles carpets from it.
//! * [`render`] writes PBM support images and palette-colored PPM images.
//! * [`checks`] runs the named verification checks.

pub mod analysis;
pub mod carpet;
pub mod checks;
pub mod error;
pub mod field;
pub mod render;
pub mod tiling;

pub use error::{Error, Result};
pub use field::{FieldElement, FieldSpec};
