//! List colouring of plane graphs with precoloured boundary paths.

pub mod canvas;
pub mod cli;
pub mod genfuzz;
pub mod governments;
pub mod harmonica;
pub mod plane_graph;
pub mod reductions;
pub mod solver;
