//! Exact-arithmetic toolkit for the two-user MIMO linear deterministic
//! interference channel: capacity regions from channel-matrix ranks,
//! rate-split linear precoders over prime fields, and random linear
//! network coding for double-unicast networks, together with brute-force
//! verification oracles for the rank and probability facts the
//! constructions rely on.

pub mod channel;
pub mod error;
pub mod field;
pub mod linalg;
pub mod matrix;
pub mod netcode;
pub mod oracle;
pub mod ratesplit;
pub mod region;

pub use channel::{ChannelQuadruple, RankProfile, ReductionReport};
pub use error::{Error, Result};
pub use field::{FieldSpec, Scalar};
pub use linalg::{InterferenceDecomposition, Rref};
pub use matrix::Matrix;
pub use netcode::{BaselineRegions, ContainmentReport, MinCuts, Network, TransferRealization};
pub use ratesplit::{Codec, MessageVectors, RateSplit, SplitBounds};
pub use region::{Inequality, RatePair, RateRegion, RegionForm};
