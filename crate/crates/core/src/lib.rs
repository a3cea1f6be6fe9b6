//! Exact weighted graph homomorphism counts and checkers for the
//! inequalities built on them.
//!
//! Counting is exact over arbitrary-precision rationals. Inequalities are
//! decided by clearing exponent denominators where the numbers stay small and
//! by rigorous interval enclosures otherwise.

#![allow(clippy::needless_range_loop)]

pub mod checks;
pub mod coloring;
pub mod enumerate;
pub mod error;
pub mod expr;
pub mod graph;
pub mod hom;
pub mod lemmas;
pub mod model;
pub mod power;
pub mod report;
pub mod scalar;
pub mod scan;
pub mod spectrum;
pub mod sym;
pub mod toy;

pub use checks::{
    check_bst, check_clique_max, check_graphical_bl, check_reverse_sidorenko, swap_injection_check,
    SwapInjectionResult,
};
pub use coloring::{cc, ominus, semiproper_count, ColorSet};
pub use enumerate::{canonical_code, enumerate_graphs, EnumOptions};
pub use error::{Error, Result};
pub use expr::{compare_exprs, Expr};
pub use graph::{
    add_apexes, build_named, graph_stats, tensor_with_k2, triangle_count, Graph, GraphFamilySpec,
};
pub use hom::{
    biclique_norm_power, hom, hom_biclique, hom_clique, hom_eps_polynomial, hom_with, EdgeKernel,
    EpsPolynomial, VertexConstraint,
};
pub use lemmas::{check_local_lemma, random_instance, LemmaInstance, MPart, LEMMA_IDS};
pub use model::{
    classify_model, model_complete_looped, model_h_eps, model_two_spin, model_widom_rowlinson,
    random_model, Classification, Model, RandomKind,
};
pub use power::{compare_power_products, CompareConfig, Comparison, PowerProduct};
pub use report::{Flag, IneqReport, Verdict};
pub use scalar::{Field, Integer, Natural, Rational, Weight};
pub use scan::{
    emit_report, run_scan, search_counterexample, Finding, GraphSource, ModelSource, ReportFormat,
    ScanIneq, ScanJob, ScanSummary, SearchJob,
};
pub use toy::reproduce_toy_c6;

/// Model with exact rational weights.
pub type ExactModel = Model<Rational>;
/// Model with `f64` weights, for quick estimates.
pub type FloatModel = Model<f64>;
/// Vertex constraint with exact rational weights.
pub type ExactConstraint = VertexConstraint<Rational>;
/// Edge kernel with exact rational weights.
pub type ExactKernel = EdgeKernel<Rational>;
