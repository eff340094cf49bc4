pub mod arrangement;
pub mod category;
pub mod chain;
pub mod delta;
pub mod error;
pub mod graph_conf;
pub mod json;
pub mod poset;
pub mod snf;
pub mod strata;

pub use arrangement::{Arrangement, Hyperplane, SignVector, Stratification};
pub use category::{AcyclicCategory, Arrow, CategoryDiagnostic, GroupAction, PosetFunctor};
pub use chain::{homology, ChainComplex, HomologyMode, HomologyResult};
pub use delta::DeltaComplex;
pub use error::{Error, Result};
pub use graph_conf::{abrams_complex, ConfSpace, Graph};
pub use poset::{Poset, PosetDiagnostic};
pub use strata::{CombinatorialCss, CssDiagnostic, SalvettiPartition};
