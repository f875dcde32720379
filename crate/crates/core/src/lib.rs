//! Directional freight routing for hub networks.
//!
//! * [`geo`]: spherical distances, bearings, midpoints and sectors.
//! * [`network`]: the hub graph, its file format and a seeded generator.
//! * [`pathfinding`]: minimum travel-time paths and time-to-destination tables.
//! * [`discovery`]: sector-constrained, budget-pruned breadth-first area discovery.
//! * [`policy`]: baseline and directional next-hop selection.
//! * [`sim`]: discrete-event consolidation and dispatch simulator with KPIs.

pub mod geo;
pub mod network;
pub mod pathfinding;
pub mod discovery;
pub mod policy;
pub mod sim;
