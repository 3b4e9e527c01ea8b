//! Batches of embedding games over seeds and adversaries.

use serde::{Deserialize, Serialize};

use crate::embed::{play, Adversary, EmbedConfig, EmbedState, FreeRandom, Request, Scripted, TreeAdversary, TreeOrder};
use crate::exec::map_trials;
use crate::graph::Graph;
use crate::report::{ExperimentReport, TrialRecord};
use crate::tree::{Tree, TreeFamily};
use crate::verify::{brute_force_induced_embed, OracleBudget, OracleResult};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AdversarySpec {
    Dfs,
    Bfs,
    Random,
    Hostile,
    /// Random growth of an unconstrained tree with occasional rollbacks.
    Free { rollback_prob: f64 },
    Script { requests: Vec<Request> },
}

impl AdversarySpec {
    pub fn name(&self) -> &'static str {
        match self {
            AdversarySpec::Dfs => "dfs",
            AdversarySpec::Bfs => "bfs",
            AdversarySpec::Random => "random",
            AdversarySpec::Hostile => "hostile",
            AdversarySpec::Free { .. } => "free",
            AdversarySpec::Script { .. } => "script",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "dfs" => AdversarySpec::Dfs,
            "bfs" => AdversarySpec::Bfs,
            "random" => AdversarySpec::Random,
            "hostile" => AdversarySpec::Hostile,
            "free" => AdversarySpec::Free { rollback_prob: 0.1 },
            _ => return None,
        })
    }

    /// The four tree-growing policies.
    pub fn standard() -> Vec<Self> {
        vec![
            AdversarySpec::Dfs,
            AdversarySpec::Bfs,
            AdversarySpec::Random,
            AdversarySpec::Hostile,
        ]
    }

    fn build(&self, tree: &Tree, seed: u64) -> Box<dyn Adversary> {
        match self {
            AdversarySpec::Dfs => Box::new(TreeAdversary::new(tree, TreeOrder::Dfs)),
            AdversarySpec::Bfs => Box::new(TreeAdversary::new(tree, TreeOrder::Bfs)),
            AdversarySpec::Random => Box::new(TreeAdversary::new(tree, TreeOrder::Random(seed))),
            AdversarySpec::Hostile => Box::new(TreeAdversary::new(tree, TreeOrder::Hostile)),
            AdversarySpec::Free { rollback_prob } => Box::new(FreeRandom::new(seed, *rollback_prob)),
            AdversarySpec::Script { requests } => Box::new(Scripted::new(requests.clone())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "kebab-case")]
pub enum TreeSource {
    Fixed { tree: Tree },
    /// A family; random families draw a fresh tree per trial seed.
    Family { family: TreeFamily },
}

impl TreeSource {
    pub fn tree_for(&self, seed: u64) -> Tree {
        match self {
            TreeSource::Fixed { tree } => tree.clone(),
            TreeSource::Family { family } => {
                let f = match family {
                    TreeFamily::Random { delta, nodes, .. } => TreeFamily::Random {
                        delta: *delta,
                        nodes: *nodes,
                        seed,
                    },
                    other => other.clone(),
                };
                f.build().expect("family parameters were validated")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialPlan {
    pub trees: TreeSource,
    pub adversaries: Vec<AdversarySpec>,
    pub seeds: Vec<u64>,
    pub embed: EmbedConfig,
    /// Cross-check each outcome against the brute-force oracle.
    pub oracle: Option<OracleBudget>,
}

impl TrialPlan {
    pub fn trial_count(&self) -> usize {
        self.adversaries.len() * self.seeds.len()
    }
}

/// Runs one game.
pub fn run_trial(g: &Graph, j: &Graph, plan: &TrialPlan, id: usize) -> TrialRecord {
    run_trial_with_state(g, j, plan, id).0
}

/// As [`run_trial`], also returning the final game state.
pub fn run_trial_with_state(
    g: &Graph,
    j: &Graph,
    plan: &TrialPlan,
    id: usize,
) -> (TrialRecord, Option<EmbedState>) {
    let adv_spec = &plan.adversaries[id / plan.seeds.len()];
    let seed = plan.seeds[id % plan.seeds.len()];
    let tree = plan.trees.tree_for(seed);
    let target = tree.node_count();
    let mut adv = adv_spec.build(&tree, seed);
    let cfg = EmbedConfig {
        seed,
        ..plan.embed.clone()
    };
    let res = play(g, j, cfg, adv.as_mut(), target);
    let stats = res.stats;
    let (success, nodes, certificate, failure, embedding) = match res.outcome {
        Ok(e) => {
            // a free adversary grows its own shape; only the size matters
            let full = e.len() == target;
            (full, e.len(), e.certificate.clone(), None, Some(e))
        }
        Err(f) => (false, f.nodes, None, Some(f), None),
    };
    let oracle = plan.oracle.as_ref().and_then(|budget| {
        let shape = match adv_spec {
            AdversarySpec::Free { .. } | AdversarySpec::Script { .. } => return None,
            _ => &tree,
        };
        match brute_force_induced_embed(g, j, shape, budget) {
            Ok(OracleResult::Found { .. }) => Some("found".to_string()),
            Ok(OracleResult::NotFound { .. }) => Some("not-found".to_string()),
            Ok(OracleResult::BudgetExhausted { .. }) => Some("budget-exhausted".to_string()),
            Err(e) => Some(format!("skipped: {e}")),
        }
    });
    let record = TrialRecord {
        id,
        seed,
        adversary: adv_spec.name().to_string(),
        success,
        target_nodes: target,
        nodes,
        steps: stats.case1 + stats.case2 + stats.rollbacks,
        reservation_retries: stats.reservation_attempts,
        rollbacks: stats.rollbacks,
        max_cascade: stats.max_cascade,
        cascade_sizes: stats.cascade_sizes,
        certificate,
        failure,
        oracle,
        embedding,
    };
    (record, res.state)
}

/// Runs every (adversary, seed) pair; the report is independent of
/// scheduling.
pub fn run_trials(g: &Graph, j: &Graph, plan: &TrialPlan, config_echo: serde_json::Value) -> ExperimentReport {
    let records = map_trials(plan.trial_count(), |id| run_trial(g, j, plan, id));
    ExperimentReport::new(config_echo, records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::RootPolicy;
    use crate::tree;

    fn cycle(n: usize) -> Graph {
        let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &e).unwrap()
    }

    #[test]
    fn paths_on_a_cycle_with_oracle() {
        let g = cycle(40);
        let plan = TrialPlan {
            trees: TreeSource::Fixed {
                tree: tree::path(8).unwrap(),
            },
            adversaries: AdversarySpec::standard(),
            seeds: vec![1, 2, 3],
            embed: EmbedConfig {
                root: RootPolicy::Fixed(0),
                ..EmbedConfig::practical(2, 2, 0)
            },
            oracle: Some(OracleBudget::default()),
        };
        let r = run_trials(&g, &g, &plan, serde_json::json!({}));
        assert_eq!(r.records.len(), 12);
        assert!(r.all_succeeded());
        assert!(r.successes_certified());
        assert!(r.records.iter().all(|x| x.oracle.as_deref() == Some("found")));
        assert_eq!(r.by_adversary.len(), 4);
        let again = run_trials(&g, &g, &plan, serde_json::json!({}));
        assert_eq!(r.to_json(), again.to_json());
    }

    #[test]
    fn random_family_varies_with_seed() {
        let src = TreeSource::Family {
            family: TreeFamily::Random {
                delta: 3,
                nodes: 30,
                seed: 0,
            },
        };
        assert_ne!(src.tree_for(1), src.tree_for(2));
        assert_eq!(src.tree_for(5), src.tree_for(5));
    }
}
