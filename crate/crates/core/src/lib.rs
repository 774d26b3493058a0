//! Prime-field number theoretic transforms.
//!
//! * [`modmath`]: residues modulo a 32-bit prime, Shoup multiplication,
//!   primitive roots and bit reversal.
//! * [`twiddle`]: root-of-unity tables and a per-`(p, n, direction)` cache.
//! * [`algorithms`]: DIT, DIF, flat, Pease, Pease without copies, Stockham and
//!   six-step transforms, the naive DFT oracle and the inverse.
//! * [`polymul`]: cyclic polynomial multiplication via the convolution theorem.
//! * [`bankmodel`]: butterfly address traces and a banked-memory scheduler that
//!   reports the achievable initiation interval.
//! * [`cli`]: the `verify`, `bench` and `banks` commands.

pub mod algorithms;
pub mod bankmodel;
pub mod cli;
mod error;
pub mod modmath;
pub mod polymul;
pub mod twiddle;

pub use algorithms::{intt, naive_dft, run_plan, NttPlan, ResidueVector, Variant};
pub use error::{Error, Result};
pub use modmath::{FieldParams, DEFAULT_PRIME};
pub use twiddle::{Direction, TwiddleCache, TwiddleTable};
