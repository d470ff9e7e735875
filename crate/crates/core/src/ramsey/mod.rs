//! Extension contexts, Nash-Williams families and fronts, and the search for
//! monochromatic extension sets behind the pigeonhole principle.

pub mod coloring;
pub mod context;
pub mod family;
pub mod order;
pub mod ordinal;
pub mod search;
pub mod space;

pub use context::{validate_context, Case, Cone, ContextReport, ExtensionContext};
pub use space::{Ambient, Space};
pub use family::{classify, family_ops, is_front, is_nash_williams, rank, symbolic_rank, FrontOutcome, NWFamily};
pub use order::{enumerate_prec, prec_cmp};
pub use ordinal::OrdinalCnf;
pub use coloring::{ColorOracle, Coloring};
pub use search::{search_monochromatic, search_with, verify_certificate, Certificate, SearchOptions, SearchOutcome, Verdict};
