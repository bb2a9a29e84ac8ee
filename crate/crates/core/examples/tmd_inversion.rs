//! Time-multiplexed detector: simulate click counts for a heralding arm,
//! invert them back to photon-number statistics, and split records into
//! passive signal/decoy subsets.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qkdrate::decoy::{
    click_histogram, forward_statistics, invert_statistics, select_passive_decoys,
    simulate_tmd_clicks, DecoyWeights, TmdConfig,
};
use qkdrate::numerics::DistributionVec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = TmdConfig::default();
    let sent = DistributionVec::thermal(0.5, cfg.n_max)?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);

    let exact = invert_statistics(&forward_statistics(&sent, &cfg)?, &cfg)?;
    let records = simulate_tmd_clicks(&sent, &cfg, 200_000, &mut rng)?;
    let sampled = invert_statistics(&click_histogram(&records, cfg.n_max), &cfg)?;

    println!("n,sent,noiseless,from_200k_records");
    for n in 0..=cfg.n_max {
        println!(
            "{n},{:.5},{:.5},{:.5}",
            sent.get(n),
            exact.distribution.get(n),
            sampled.distribution.get(n)
        );
    }

    // no click -> mostly decoy, any click -> mostly signal
    let weights = DecoyWeights::parse("0:0.9,*:0.1")?;
    let split = select_passive_decoys(&records, &weights, 1000, &mut rng)?;
    println!(
        "signal subset mean clicks {:.3}, decoy subset mean clicks {:.3}",
        split.signal_stats.mean(),
        split.decoy_stats.mean()
    );
    Ok(())
}
