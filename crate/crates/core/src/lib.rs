//! Exact computation of bigraded Hochschild and Harrison cohomology for
//! finite-dimensional graded algebras, and the obstruction-theoretic
//! trivialization of A(∞)-structures presented as twisting cochains.
//!
//! Everything is generic over the coefficient [`field::Field`]; the two
//! shipped instances are the rationals and runtime-chosen prime fields.
//! Concrete aliases for both are exported at the crate root.

pub mod algebra;
pub mod cochain;
pub mod cohomology;
pub mod comb;
pub mod doc;
pub mod field;
pub mod linalg;
pub mod samples;
pub mod sign;
pub mod space;
pub mod twisting;
pub mod word;

pub use field::{Field, FieldSpec, PrimeField, Rationals};

/// Rational scalar: arbitrary-precision `BigRational`.
pub type Rational = num_rational::BigRational;

pub type RationalSpace = space::GradedSpace<Rationals>;
pub type RationalAlgebra = algebra::GradedAlgebra<Rationals>;
pub type RationalBimodule = algebra::GradedBimodule<Rationals>;
pub type RationalCochain = cochain::Cochain<Rationals>;
pub type RationalStructure = twisting::AInfStructure<Rationals>;
pub type RationalTwisting = twisting::TwistingCochain<Rationals>;
pub type RationalMorphism = twisting::AInfMorphism<Rationals>;

pub type PrimeSpace = space::GradedSpace<PrimeField>;
pub type PrimeAlgebra = algebra::GradedAlgebra<PrimeField>;
pub type PrimeBimodule = algebra::GradedBimodule<PrimeField>;
pub type PrimeCochain = cochain::Cochain<PrimeField>;
pub type PrimeStructure = twisting::AInfStructure<PrimeField>;
pub type PrimeTwisting = twisting::TwistingCochain<PrimeField>;
pub type PrimeMorphism = twisting::AInfMorphism<PrimeField>;
