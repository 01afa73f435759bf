//! WKB expansion of the full problem in powers of `√ε`: outer Stokes–Darcy terms
//! plus exponentially decaying layer correctors at each interface component.

pub mod bundle;
pub mod evaluate;
pub mod recursion;
pub mod residuals;

pub use bundle::{ExpansionBundle, LayerTerm, OrderTerm};
pub use evaluate::{evaluate_expansion, ExpansionSampler};
pub use recursion::{
    build_bundle, build_order0, build_order1, build_orderj, build_orderj_with_hooks,
    MAX_EXPANSION_ORDER,
};
pub use residuals::{residual_summary, OrderResiduals};
