//! Sweeps of the big-T solver over symmetric p-lattices, the duality route
//! for decreasing pieces, and a closed-form 1-D reference.

mod pgrid;
mod sweep;
mod table;

pub use pgrid::PGrid;
pub use sweep::{
    dual_piece, oracle_1d_eikonal, sweep, sweep_detailed, sweep_piece, sweep_plan,
    sweep_quasiconcave, ORACLE_NODES,
};
pub use table::{EffectiveTable, Provenance};
