//! Fat round handle calculus for non-singular Morse-Smale flows on S³ whose
//! saddle orbits are unknotted and unlinked.

pub mod dsl;
pub mod enumerate;
pub mod error;
pub mod flow;
pub mod link;
pub mod order;
pub mod render;

pub use error::{DslError, EnumerateError, FlowError, LinkError, OrderError, RenderError};
pub use flow::{
    admissible, basic_flow, classify, identify, BasicHandleKind, BasicOp, CanonicalFlow, FatHandle, FlowModel,
    HandleClass, Polarity,
};
pub use link::{CanonicalLink, IndexedLink, OrbitId, OrbitIndex};
