//! Fermat difference-of-squares factoring, plus two reformulations of the
//! same search as exact-integer QUBO problems and classical samplers for them.

pub mod corpus;
pub mod encoders;
pub mod fermat;
pub mod integers;
pub mod qubo;
pub mod solvers;

pub use fermat::{factor_fermat, Factorization, FermatBounds, FermatError, Method, ResidueFilter, ResidueWheel};
pub use integers::{bitlen, ceil_sqrt, is_perfect_square, isqrt};
pub use qubo::{IsingModel, ParseError, QuboDocument, QuboError, QuboModel};

pub use num_bigint::{BigInt, BigUint};
