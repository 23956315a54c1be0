//! Free-superalgebra rewriting: expansion, oriented relations, bounded
//! completion, substitution and verification certificates.

mod element;
mod expr;
mod system;
mod verify;

pub use element::{FreeElement, Word};
pub use expr::{expand, htilde_definition, Expr};
pub use system::{
    rules_from, CompletionStats, LogEntry, NormalForm, RewriteSystem, Rule, RuleClass, RuleOrigin,
    DEFAULT_STEP_CEILING,
};
pub use verify::{
    substitute, substitute_with, Bounds, Certificate, OutcomeStatus, Verifier, RESOLUTION_DEGREE,
};
