pub mod coherent;
pub mod corpus;
pub mod fincat;
pub mod homotopy;
pub mod kan;
pub mod setoid;
pub mod text;
pub mod truncation;
pub mod verdict;
