//! Exact arithmetic: integer matrices with normal forms, integer lattices,
//! conjugacy searches, and real quadratic field elements.

mod intmat;
mod lattice;
mod quad;

pub use intmat::{IntMat, Snf};
pub use lattice::{
    commutant_lattice, eigen_data, form_represents_unit, gl2z_conjugator,
    unimodular_in_lattice, unimodular_in_lattice3, CentralizerError, ConjugatorObstruction,
    ConjugatorSearch, EigenData, EigenKind, LatticeBasis, LatticeError, SpectralError,
};
pub use lattice::{centralizer_generator, pair_lattice, PairSign};
pub use quad::QuadExt;
