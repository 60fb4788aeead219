// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Index loops over parallel stage arrays read closer to the tableaux.
#![allow(clippy::needless_range_loop)]

pub mod compare;
pub mod curve;
pub mod integrate;
pub mod lattice;
pub mod odekernel;
pub mod poly;
pub mod report;
pub mod roots;
pub mod sharp;
pub mod specfile;
pub mod specialfns;
pub mod sweep;
