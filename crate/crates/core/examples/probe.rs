use curvette_core::corpus;
use curvette_core::intersection::{entry_contact, entry_expansion};
use curvette_core::Semidegree;
use std::time::Instant;

fn main() {
    let nu0 = Semidegree::degree_valuation("xi");
    for cap in [6u32, 12, 20, 30, 45, 60] {
        let mut rng = corpus::rng(42 + cap as u64);
        let mut worst = std::time::Duration::ZERO;
        let mut worst_p = 0;
        let t0 = Instant::now();
        for _ in 0..8 {
            let psi = corpus::random_adapted_series(&mut rng, 3, cap);
            let t = Instant::now();
            assert_eq!(entry_contact(&psi, &psi).unwrap(), entry_expansion(&psi, &psi).unwrap());
            assert_eq!(entry_contact(&nu0, &psi).unwrap(), entry_expansion(&nu0, &psi).unwrap());
            let dt = t.elapsed();
            if dt > worst { worst = dt; worst_p = psi.polydromy(); }
        }
        println!("cap {:>2}: total {:?} worst {:?} at p = {}", cap, t0.elapsed(), worst, worst_p);
    }
}
