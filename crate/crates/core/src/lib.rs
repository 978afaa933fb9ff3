//! Braid-group workbench: Garside normal forms computed algebraically, curve
//! diagrams computed geometrically, and the winding-number labelling that
//! connects the two.
//!
//! Braids act on the right throughout: the diagram of `w1 w2` is the image of
//! the diagram of `w1` under `w2`.

pub mod diagram;
pub mod error;
pub mod garside;
pub mod harness;
pub mod labels;
pub mod relax;
pub mod sigma;
pub mod word;


pub use error::{Error, Result};
pub use diagram::{CurveDiagram, Direction, Point, Side};
pub use garside::{NormalForm, Permutation};
pub use labels::{LabelTrace, Scope};
pub use relax::{BelowOrder, Factor, Factorization, RelaxationStep, StepKind};

pub use word::{BraidWord, Letter};
