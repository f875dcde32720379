//! Baseline vs directional over the standard demand levels on one generated
//! network. Usage: `cargo run --release --example table_trends [net_seed]`.

use dirroute::network::{generate_network, GeneratorParams};
use dirroute::policy::RoutingMode;
use dirroute::sim::{compare_runs, generate_shipments, run_simulation, ScenarioConfig};

fn main() {
    let net_seed: u64 = std::env::args().nth(1).map_or(7, |s| s.parse().expect("integer seed"));
    let net = generate_network(&GeneratorParams::default(), net_seed).expect("network");
    for count in [600, 1000, 1200, 2000] {
        for seed in 1..=5 {
            let dir_cfg = ScenarioConfig { shipment_count: count, seed, ..Default::default() };
            let base_cfg = ScenarioConfig { mode: RoutingMode::Baseline, ..dir_cfg.clone() };
            let shipments = generate_shipments(&net, &dir_cfg).expect("shipments");
            let base = run_simulation(&net, &shipments, &base_cfg).expect("baseline run");
            let dir = run_simulation(&net, &shipments, &dir_cfg).expect("directional run");
            let cmp = compare_runs(&base_cfg, &base.kpis, &dir_cfg, &dir.kpis).expect("comparable");
            println!(
                "{count:5} seed {seed}: on-time {:5.1}% / {:5.1}%  trucks {:4} -> {:4} ({:+.1}%)  miles {:8.0} -> {:8.0} ({:+.1}%)",
                cmp.baseline.delivered_on_time_pct,
                cmp.directional.delivered_on_time_pct,
                cmp.baseline.trucks_dispatched,
                cmp.directional.trucks_dispatched,
                cmp.trucks_delta_pct.unwrap_or(0.0),
                cmp.baseline.total_miles,
                cmp.directional.total_miles,
                cmp.miles_delta_pct.unwrap_or(0.0),
            );
        }
    }
}
