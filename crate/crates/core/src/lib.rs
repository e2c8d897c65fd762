//! Legendrian realization of simple closed curves on ribbon surfaces of Legendrian
//! graphs, and compilation of open books into contact surgery diagrams.

pub mod fixtures;
pub mod front_model;
pub mod curve_model;
pub mod legendrian_graph;
pub mod openbook;
pub mod realizer;
pub mod ribbon;
pub mod sample;
