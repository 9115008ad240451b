//! Gauge theory on the flat contact Calabi-Yau 7-model.

pub mod exact;
pub mod exterior;
pub mod lie;
pub mod sasaki;
pub mod gauge;
pub mod lattice;
pub mod reports;
pub mod symbols;
