use std::sync::Arc;
use std::time::Duration;

use csp_resolver::{encode, solve, ResolutionResult};
use ensemble_core::EnsembleCandidates;
use farm_sim::{FieldsStatus, KnowledgeSnapshot, Resolver, ResolverError, TaskList, WorldConfig};

use crate::geometry::ScenarioGeometry;
use crate::scenario::{drone_protection_spec, ScenarioInput};
use crate::tasks::derive_tasks;

/// Candidates and solver outcome of the most recent resolution, kept for
/// dataset harvesting.
#[derive(Debug, Clone)]
pub struct LastResolution {
    pub candidates: EnsembleCandidates,
    pub result: ResolutionResult,
}

/// Resolves every instant exactly with the branch-and-bound solver.
pub struct ExactResolver {
    geometry: Arc<ScenarioGeometry>,
    spec: ensemble_core::EnsembleSpec<ScenarioInput>,
    budget: Duration,
    last: Option<LastResolution>,
}

impl ExactResolver {
    /// Default per-resolution budget; exhaustive search at the default scale
    /// finishes far below it.
    pub const DEFAULT_BUDGET: Duration = Duration::from_secs(5);

    pub fn new(cfg: &WorldConfig) -> Self {
        Self::with_budget(cfg, Self::DEFAULT_BUDGET)
    }

    pub fn with_budget(cfg: &WorldConfig, budget: Duration) -> Self {
        let geometry = Arc::new(ScenarioGeometry::from_config(cfg));
        let spec = drone_protection_spec(Arc::clone(&geometry));
        ExactResolver { geometry, spec, budget, last: None }
    }

    pub fn geometry(&self) -> &Arc<ScenarioGeometry> {
        &self.geometry
    }

    pub fn last_resolution(&self) -> Option<&LastResolution> {
        self.last.as_ref()
    }

    pub fn take_last_resolution(&mut self) -> Option<LastResolution> {
        self.last.take()
    }
}

impl Resolver for ExactResolver {
    fn resolve(
        &mut self,
        snapshot: &KnowledgeSnapshot,
        status: &FieldsStatus,
    ) -> Result<TaskList, ResolverError> {
        let input = ScenarioInput { snapshot: snapshot.clone(), status: status.clone() };
        let candidates = ensemble_core::evaluate_candidates(&self.spec, &input)
            .map_err(|e| ResolverError::Failed(format!("candidate evaluation: {e}")))?;
        let problem = encode(&candidates);
        let result =
            solve(&problem, self.budget).map_err(|e| ResolverError::Failed(format!("solve: {e}")))?;
        let tasks = derive_tasks(&candidates, &result.best, snapshot, &self.geometry)
            .map_err(|e| ResolverError::Failed(format!("task derivation: {e}")))?;
        self.last = Some(LastResolution { candidates, result });
        Ok(tasks)
    }

    fn name(&self) -> &str {
        "exact"
    }
}
