//! Characters, models and rough path data.

pub mod character;
pub mod degree;
pub mod group;
pub mod holder;
pub mod path;
pub mod translate;

pub use character::{chen_check_trees, chen_check_words, Character, ChenReport, Violation};
pub use path::{canonical_lift, lift_domain, PathSpec, Piecewise, Poly};
pub use translate::{pair_words, push_forward_h2, ClassicalIso};
pub use degree::{degree, tplus_filter, DegreeMap};
pub use holder::{holder_report, HolderRow};
