//! Linear relations among the trace invariants of a matrix under orthogonal
//! conjugation.
//!
//! The degree-`d` invariants of `x ↦ g x gᵀ` on `n × n` matrices are spanned
//! by products of traces of words in `x` and `xᵀ`. For `d ≤ n` these products
//! are linearly independent; beyond that they satisfy linear relations. This
//! crate enumerates the spanning products, finds the relations by random
//! evaluation with exact certification ([`montecarlo`]), and recomputes the
//! `d = n + 1` relations independently from Young symmetrizers
//! ([`symmetrizer`]).
//!
//! ```
//! use trace_relations::{find_relations, Limits, SamplerConfig};
//!
//! let set = find_relations(2, 3, &SamplerConfig::with_seed(7), &Limits::default()).unwrap();
//! assert_eq!(set.relations.len(), 2);
//! ```

pub mod combinatorics;
pub mod dimensions;
pub mod error;
pub mod evaluation;
pub mod limits;
pub mod linalg;
pub mod montecarlo;
pub mod perm;
pub mod symmetrizer;

pub use combinatorics::{
    class_of_involution, enumerate_fpf_involutions, enumerate_invariant_basis, involution_to_monomial, tau,
    FpfInvolution, InvariantMonomial, Letter, NecklaceClassId, TraceWord,
};
pub use dimensions::{catalan, fpf_count, rel_dim_formula, stable_range, two_part_partitions, DimRecord, Partition};
pub use error::{Error, Result};
pub use evaluation::{
    contract_matching, evaluate_basis_row, evaluate_monomial, evaluate_word, MatrixSample, ScalarMode, ScalarValue,
};
pub use limits::Limits;
pub use montecarlo::{
    find_relations, rel_dimension_table, verify_relation, Method, RelationSet, RelationVector, SamplerConfig,
};
pub use perm::Permutation;
pub use symmetrizer::{
    enumerate_standard_tableaux, symmetrizer_relation_space, two_column_shape, young_symmetrizer, GroupAlgebraElement,
    StandardTableau,
};
