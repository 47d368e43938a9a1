use farm_sim::{
    run_episode, EpisodeResult, FieldsStatus, KnowledgeSnapshot, Resolver, ResolverError,
    TaskList, WorldConfig,
};
use scenario_farm::ExactResolver;

use crate::sample::record_sample;
use crate::{Sample, Schema};

/// Wraps the exact resolver and records one labeled sample per resolution
/// instant — the "historical solver invocations" a classifier trains on.
pub struct RecordingResolver {
    exact: ExactResolver,
    schema: Schema,
    pub samples: Vec<Sample>,
    pub rejected: u64,
}

impl RecordingResolver {
    pub fn new(cfg: &WorldConfig, schema: Schema) -> Self {
        RecordingResolver {
            exact: ExactResolver::new(cfg),
            schema,
            samples: Vec::new(),
            rejected: 0,
        }
    }
}

impl Resolver for RecordingResolver {
    fn resolve(
        &mut self,
        snapshot: &KnowledgeSnapshot,
        status: &FieldsStatus,
    ) -> Result<TaskList, ResolverError> {
        let tasks = self.exact.resolve(snapshot, status)?;
        let last = self.exact.last_resolution().expect("exact resolver stores its last result");
        match record_sample(&self.schema, snapshot, &last.candidates, &last.result) {
            Ok(sample) => self.samples.push(sample),
            Err(_) => self.rejected += 1,
        }
        Ok(tasks)
    }

    fn name(&self) -> &str {
        "exact-recording"
    }
}

/// Samples plus the episode outcome they were harvested from.
#[derive(Debug, Clone)]
pub struct RecordedEpisode {
    pub seed: u64,
    pub samples: Vec<Sample>,
    pub rejected: u64,
    pub episode: EpisodeResult,
}

/// Runs one exact-resolver episode, recording a sample at every resolution
/// instant (600 per default-length episode).
pub fn run_recording_episode(
    cfg: &WorldConfig,
    schema: &Schema,
    seed: u64,
    minutes: u64,
) -> Result<RecordedEpisode, farm_sim::ConfigError> {
    let mut resolver = RecordingResolver::new(cfg, schema.clone());
    let episode = run_episode(cfg, &mut resolver, seed, minutes, false)?;
    Ok(RecordedEpisode {
        seed,
        samples: resolver.samples,
        rejected: resolver.rejected,
        episode,
    })
}
