pub mod coaction;
pub mod corpus;
pub mod graph;
pub mod lemmas;
pub mod ncstar;
pub mod perm;
pub mod presentations;
pub mod store;
pub mod table4;
pub mod witness;
