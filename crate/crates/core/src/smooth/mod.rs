//! Finite models of smooth mod-p representations of `GL₂(Q_p)`: compactly
//! supported functions on the tree with the Hecke operator, and locally
//! constant functions on `P¹` at a fixed level.

mod mat;
mod p1;
mod tree;

pub use mat::{Mat2, Rat};
pub use p1::{p1_dim, p1_points, sp_dim, P1Function, P1Point, P1_SCHEMA};
pub use tree::{
    hecke_kernel_cokernel, hecke_matrix, kernel_cokernel_from, sym_matrix, tree_dim, TreeFunction, Vertex, TREE_SCHEMA,
};
