//! Randomized verification of the identity catalog.
//!
//! Samplers draw parameters that satisfy each identity's hypotheses by
//! construction where possible and resample otherwise. Reports are keyed by
//! case index and carry no timings, so a run is reproducible from its seed.

mod sampler;
mod verify;

pub use sampler::{sample, sample_case, SampleMode, SampledCase, SamplerSpec, GENERATOR, MAX_RETRIES};
pub use verify::{cross_check, default_specs, verify, CaseRecord, CrossPair, Summary, VerifyReport};
