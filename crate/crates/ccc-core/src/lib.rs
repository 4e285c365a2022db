//! Exact-arithmetic polyhedral Euler calculus and microlocal certification of
//! equivariant vector bundles on toric varieties.
//!
//! The crate is organized around six layers:
//!
//! * [`linalg`] — exact rational matrices and small integer lattice solves;
//! * [`geometry`] — cones, relatively open cells, Fourier–Motzkin
//!   elimination and hyperplane arrangements;
//! * [`euler`] — constructible functions with Euler integration,
//!   pushforward, convolution, Fourier–Sato transform, microlocalization and
//!   singular support;
//! * [`toric`] — fans, Cartier data and Klyachko filtration data with
//!   per-cone splitting, weight multisets and the bundle-to-function map;
//! * [`theta`] — sheaf-level complexes of translated-dual-cone generators:
//!   Čech resolutions, compactly supported sections, Morse filtrations,
//!   microlocal stalk complexes and cohomology tables;
//! * [`certify`] — the decision procedures: convexity, vector-bundle and
//!   nefness certification with an independent invariant-curve oracle, and
//!   image membership for constructible functions.
//!
//! File formats and the CLI wrapper live in [`io`].

mod certify;
pub mod euler;
pub mod geometry;
mod io;
pub mod linalg;
mod theta;
pub mod toric;
