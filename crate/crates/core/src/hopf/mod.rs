//! Coproducts, Guin–Oudom products and the post-Lie envelope product.

pub mod coproduct;
pub mod guin_oudom;
pub mod star2;

pub use coproduct::{delta_bck, delta_bck_hat, delta_dbck, delta_dbck_bar, deshuffle_forest, Truncated};
pub use guin_oudom::GuinOudom;
pub use star2::H2;

use crate::tree::Forest;
use crate::vect::Vect;

pub type Tensor = Vect<(Forest, Forest)>;

/// `(a⊗b)(c⊗d) = ac⊗bd` on forest tensors.
pub fn tensor_mul(x: &Tensor, y: &Tensor) -> Tensor {
    let mut out = Vect::zero();
    for ((a, b), c) in x.iter() {
        for ((d, e), f) in y.iter() {
            out.add_term((a.mul(d), b.mul(e)), c * f);
        }
    }
    out
}

/// Forest product extended bilinearly.
pub fn forest_mul(x: &Vect<Forest>, y: &Vect<Forest>) -> Vect<Forest> {
    let mut out = Vect::zero();
    for (a, c) in x.iter() {
        for (b, d) in y.iter() {
            out.add_term(a.mul(b), c * d);
        }
    }
    out
}
