//! Chunk calculation for the self-scheduling techniques.

mod rules;
mod state;
mod technique;

pub use rules::{
    chunk_af, chunk_fac, chunk_fsc, chunk_gss, chunk_weighted, fac_chunk_count, mfsc_chunk,
    rand_bounds, weights_from_totals, TssParams,
};
pub use state::{update_weights, PerfSample, TechniqueParams, TechniqueState};
pub use technique::Technique;
