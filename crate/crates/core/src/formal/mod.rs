//! The formal double Eisenstein and formal double zeta spaces.

mod cache;
mod element;
mod genid;
mod maps;
mod relations;
mod system;

pub use cache::{resolve_cache_dir, CacheEntry, RelationCache, CACHE_DIR_ENV, FORMAT_VERSION};
pub use element::{FormalElement, LinComb};
pub use genid::{GenId, Space};
pub use maps::{map_partial, map_pi, map_sigma};
pub use relations::{
    depth_two_indices, eisenstein_relations, enumerate_generators, relations, shuffle_expansion, stuffle_expansion,
    zeta_relations, zeta_shuffle_expansion, zeta_stuffle_expansion,
};
pub use system::RelationSystem;
