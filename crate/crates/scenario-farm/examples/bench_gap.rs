use farm_sim::{run_episode, NeverResolver, WorldConfig};
use scenario_farm::ExactResolver;

fn main() {
    let cfg = WorldConfig::default();
    let n = 30;
    let mut never_scores = Vec::new();
    let mut exact_scores = Vec::new();
    for seed in 0..n {
        let mut never = NeverResolver;
        never_scores.push(run_episode(&cfg, &mut never, seed, 600, false).unwrap().undisturbed_minutes);
        let mut exact = ExactResolver::new(&cfg);
        exact_scores.push(run_episode(&cfg, &mut exact, seed, 600, false).unwrap().undisturbed_minutes);
    }
    let mean = |v: &Vec<f64>| v.iter().sum::<f64>() / v.len() as f64;
    println!("never mean {:.1}  exact mean {:.1}", mean(&never_scores), mean(&exact_scores));
    let wins = never_scores.iter().zip(&exact_scores).filter(|(n, e)| e < n).count();
    println!("exact beats never on {wins}/{n} seeds");
}
