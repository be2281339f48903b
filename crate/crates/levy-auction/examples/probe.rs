use levy_auction::sim::{derive_trial_seed, run_trial, Bias, NoiseFraction, SimConfig};

fn cell(rate: f64, gamma: f64, bias: Bias, tpl: &SimConfig, base: u64) -> Vec<f64> {
    (0..10u32)
        .map(|trial| {
            let config = SimConfig {
                event_rate: rate, gamma, bias,
                seed: derive_trial_seed(base, rate, gamma, bias, trial),
                ..tpl.clone()
            };
            run_trial(&config).unwrap().report.efficiency
        })
        .collect()
}

fn mw_u(a: &[f64], b: &[f64]) -> f64 {
    let mut u = 0.0;
    for &x in a { for &y in b { if x > y { u += 1.0 } else if x == y { u += 0.5 } } }
    u
}

fn se2(a: &[f64], b: &[f64]) -> f64 {
    let m = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let var = |v: &[f64]| { let mu = m(v); v.iter().map(|x| (x-mu).powi(2)).sum::<f64>() / (v.len()-1) as f64 };
    (m(a) - m(b)).abs() / (var(a)/a.len() as f64 + var(b)/b.len() as f64).sqrt()
}

fn main() {
    for phi in [0.55, 0.65, 0.7, 0.75, 0.85, 0.9] {
        for base in [2024u64, 777, 31415] {
            let tpl = SimConfig { noise_fraction: NoiseFraction::Fixed(phi), ..SimConfig::default() };
            print!("phi {phi:>4} seed {base:>6} |");
            for &rate in &[1.0, 10.0, 100.0] {
                let a = cell(rate, 0.5, Bias::NoBias, &tpl, base);
                let b = cell(rate, 1.5, Bias::NoBias, &tpl, base);
                let c = cell(rate, 2.5, Bias::NoBias, &tpl, base);
                print!(" r{rate}: {:>5.1}/{:>5.1}", mw_u(&a, &b), mw_u(&b, &c));
            }
            let b = cell(1000.0, 1.5, Bias::NoBias, &tpl, base);
            let c = cell(1000.0, 2.5, Bias::NoBias, &tpl, base);
            print!(" | eq: {:>4.2}", se2(&b, &c));
            let bb = cell(1000.0, 1.5, Bias::QuantityBias, &tpl, base);
            let cb = cell(1000.0, 2.5, Bias::QuantityBias, &tpl, base);
            println!(" | bias: {:>5.1}", mw_u(&bb, &cb));
        }
    }
}
