use thiserror::Error;

use crate::flow::HandleClass;
use crate::link::{OrbitId, OrbitIndex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinkError {
    #[error("orbit index must be 0, 1 or 2, got {0}")]
    BadIndex(u8),
    #[error("a saddle cannot be a Hopf component")]
    SaddleInHopf,
    #[error("unknown orbit {0}")]
    UnknownOrbit(OrbitId),
    #[error("saddle {0} cannot be removed")]
    SaddleRemoval(OrbitId),
    #[error("orbit {orbit} has index {found}, expected {expected}")]
    WrongIndex {
        orbit: OrbitId,
        expected: OrbitIndex,
        found: OrbitIndex,
    },
    #[error("bad link notation `{0}`")]
    Notation(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlowError {
    #[error(transparent)]
    Link(#[from] LinkError),
    #[error("Bitorus: identifying a class {0} handle with a class {1} handle is not admissible")]
    Bitorus(HandleClass, HandleClass),
    #[error("Polarity: fat handles must have opposite polarities")]
    Polarity,
    #[error("invalid basic flow selector: {0}")]
    Selector(String),
    #[error("gluing two iterated fat handles is not a filtration step; one side must carry a single saddle")]
    IteratedGluing,
    #[error("removal of {0} leaves a region outside the three handle classes")]
    Unclassifiable(OrbitId),
    #[error("construction step refers to orbit {0} that does not exist yet")]
    Dependency(OrbitId),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("heteroclinic relation has a cycle through {0}")]
    Cycle(OrbitId),
    #[error("flow was not built by operation III alone")]
    NotF3,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerateError {
    #[error("saddle count {requested} outside 1..={bound}")]
    Bound { requested: usize, bound: usize },
    #[error(transparent)]
    Flow(#[from] FlowError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("ambiguous selector `{slot}`; candidates: {}", candidates.join(", "))]
    Ambiguous {
        slot: &'static str,
        candidates: Vec<String>,
    },
    #[error("selector `{slot}` = {value} does not match any legal component")]
    BadSelector { slot: &'static str, value: String },
    #[error("selector `{0}` does not apply to this node")]
    Misplaced(&'static str),
    #[error("expression cannot be elaborated: both operands are iterated")]
    NotElaborable,
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Link(#[from] LinkError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("flow has {saddles} saddles; drawable limit is {limit}")]
    TooLarge { saddles: usize, limit: usize },
    #[error(transparent)]
    Order(#[from] OrderError),
}

impl LinkError {
    pub fn name(&self) -> &'static str {
        match self {
            LinkError::BadIndex(_) => "BadIndex",
            LinkError::SaddleInHopf => "SaddleInHopf",
            LinkError::UnknownOrbit(_) => "UnknownOrbit",
            LinkError::SaddleRemoval(_) => "SaddleRemoval",
            LinkError::WrongIndex { .. } => "WrongIndex",
            LinkError::Notation(_) => "Notation",
        }
    }
}

impl FlowError {
    /// Variant name, with wrapped link errors reported by their own name.
    pub fn name(&self) -> &'static str {
        match self {
            FlowError::Link(e) => e.name(),
            FlowError::Bitorus(..) => "Bitorus",
            FlowError::Polarity => "Polarity",
            FlowError::Selector(_) => "Selector",
            FlowError::IteratedGluing => "IteratedGluing",
            FlowError::Unclassifiable(_) => "Unclassifiable",
            FlowError::Dependency(_) => "Dependency",
        }
    }
}

impl OrderError {
    pub fn name(&self) -> &'static str {
        match self {
            OrderError::Cycle(_) => "Cycle",
            OrderError::NotF3 => "NotF3",
        }
    }
}

impl EnumerateError {
    pub fn name(&self) -> &'static str {
        match self {
            EnumerateError::Bound { .. } => "Bound",
            EnumerateError::Flow(e) => e.name(),
        }
    }
}

impl DslError {
    pub fn name(&self) -> &'static str {
        match self {
            DslError::Syntax { .. } => "Syntax",
            DslError::Ambiguous { .. } => "Ambiguous",
            DslError::BadSelector { .. } => "BadSelector",
            DslError::Misplaced(_) => "Misplaced",
            DslError::NotElaborable => "NotElaborable",
            DslError::Flow(e) => e.name(),
            DslError::Link(e) => e.name(),
        }
    }
}

impl RenderError {
    pub fn name(&self) -> &'static str {
        match self {
            RenderError::TooLarge { .. } => "TooLarge",
            RenderError::Order(e) => e.name(),
        }
    }
}
