//! Invariants of classical and virtual links computed from Gauss data:
//! biquandle coloring counts, parities, the parity bracket, biquandle
//! brackets and the parity-biquandle bracket.

pub mod algebra;
pub mod biquandle;
pub mod brackets;
pub mod freegraph;
pub mod gauss;
pub mod parity;
pub mod relations;
pub mod search;

pub use algebra::{Laurent, LaurentZ, RingDescriptor, Scalar, Zmod};
pub use biquandle::Biquandle;
pub use gauss::{LinkDiagram, MoveDescriptor, Role, Sign};
pub use num_bigint::BigInt;

pub type Z2 = Zmod<2>;
pub type Z3 = Zmod<3>;
pub type Z5 = Zmod<5>;
pub type Z7 = Zmod<7>;
pub type Z11 = Zmod<11>;
