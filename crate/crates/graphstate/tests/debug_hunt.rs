use graphstate::oracle::{self, MeasurementFunctional};
use graphstate::rankdp::amplitude_via_decomposition;
use graphstate::width::{exact_rank_width, heuristic_rank_decomposition};
use graphstate::Graph;

#[test]
#[ignore]
fn hunt_minimal_failure() {
    for n in 2..=8usize {
        for seed in 0..200u64 {
            let mut rng = graphstate::random::rng(seed);
            let g = graphstate::random::graph(&mut rng, n, 0.5);
            let rot = graphstate::random::rotations(&mut rng, n);
            let x = graphstate::random::outcome(&mut rng, n);
            let f = MeasurementFunctional::outcome_rows(&rot, &x).unwrap();
            let dense = oracle::amplitude(&g, &f, 24).unwrap();
            for (name, d) in [
                ("heur0", heuristic_rank_decomposition(&g, 0, 0).decomposition),
                ("heur1-5", heuristic_rank_decomposition(&g, 1, 5).decomposition),
                ("exact", exact_rank_width(&g, 16).unwrap().decomposition),
            ] {
                let dp = amplitude_via_decomposition(&g, &d, &f).unwrap();
                if (dp - dense).norm() > 1e-9 {
                    panic!(
                        "FAIL n={n} seed={seed} kind={name}\ngraph={g:?}\nedges={:?}\nleaves={:?}\ndp={dp} dense={dense}",
                        d.edges(),
                        d.leaves()
                    );
                }
            }
        }
    }
}
