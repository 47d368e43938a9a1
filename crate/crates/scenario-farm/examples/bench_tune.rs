use farm_sim::{run_episode, NeverResolver, WorldConfig};
use scenario_farm::ExactResolver;

fn trial(name: &str, cfg: &WorldConfig, n: u64) {
    let mut never_scores = Vec::new();
    let mut exact_scores = Vec::new();
    for seed in 0..n {
        let mut never = NeverResolver;
        never_scores.push(run_episode(cfg, &mut never, seed, 600, false).unwrap().undisturbed_minutes);
        let mut exact = ExactResolver::new(cfg);
        exact_scores.push(run_episode(cfg, &mut exact, seed, 600, false).unwrap().undisturbed_minutes);
    }
    let mean = |v: &Vec<f64>| v.iter().sum::<f64>() / v.len() as f64;
    let wins = never_scores.iter().zip(&exact_scores).filter(|(n, e)| e < n).count();
    println!("{name}: never {:.1} exact {:.1} (exact wins {wins}/{n})", mean(&never_scores), mean(&exact_scores));
}

fn main() {
    let n = 24;
    trial("baseline               ", &WorldConfig::default(), n);

    let mut c1 = WorldConfig::default();
    c1.drone_speed = 8.0;
    trial("speed8                 ", &c1, n);

    let mut c2 = c1.clone();
    c2.scare_radius = 25.0;
    trial("speed8 radius25        ", &c2, n);

    let mut c3 = c2.clone();
    c3.flee_ticks = 60;
    trial("speed8 radius25 flee60 ", &c3, n);

    let mut c4 = c3.clone();
    c4.fly_drain = 1.0 / 7200.0; // 2h endurance
    trial("... plus 2h endurance  ", &c4, n);
}
