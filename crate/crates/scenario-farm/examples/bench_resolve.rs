use std::sync::Arc;
use std::time::Instant;

use farm_sim::{run_episode, WorldConfig};
use scenario_farm::{random_snapshot, ExactResolver, ScenarioGeometry};
use farm_sim::Resolver;

fn main() {
    let cfg = WorldConfig::default();
    let geom = Arc::new(ScenarioGeometry::from_config(&cfg));
    let mut resolver = ExactResolver::new(&cfg);
    let mut latencies = Vec::new();
    let mut var_counts = Vec::new();
    for seed in 0..500u64 {
        let (snap, status) = random_snapshot(&geom, 4, 5, (400.0, 300.0), seed);
        let t0 = Instant::now();
        let _ = resolver.resolve(&snap, &status).unwrap();
        latencies.push(t0.elapsed().as_micros() as u64);
        if let Some(last) = resolver.last_resolution() {
            var_counts.push(last.candidates.variable_count());
        }
    }
    latencies.sort();
    var_counts.sort();
    println!(
        "resolve us: min {} p50 {} p90 {} max {} | vars p50 {} max {}",
        latencies[0], latencies[250], latencies[450], latencies[499],
        var_counts[250], var_counts[var_counts.len()-1]
    );

    let t0 = Instant::now();
    let mut r = ExactResolver::new(&cfg);
    let ep = run_episode(&cfg, &mut r, 42, 600, false).unwrap();
    println!(
        "episode(600min): {:?}, undisturbed {:.1} min, failures {}",
        t0.elapsed(), ep.undisturbed_minutes, ep.failures
    );
}
