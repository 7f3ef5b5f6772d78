//! Run every built-in mechanism on one profile and compare against the optimum.

use facloc::{ratio, LocationProfile, MechanismSpec, PNorm};

fn main() -> facloc::Result<()> {
    let two: LocationProfile = "0, 1".parse()?;
    let many: LocationProfile = "-3, 0, 0.5, 2, 7".parse()?;
    let p = PNorm::TWO;

    let specs = [
        "median",
        "order:2",
        "dictator:1",
        "opt",
        "lrm",
        "threepoint:0.25",
        "symmetrize(dictator:1)",
        "mixture:{dict:[0.5,0],order:[0.25,0.25],opt:0}",
    ];
    for text in specs {
        let spec: MechanismSpec = text.parse()?;
        let profile = if spec.is_two_agent_only() {
            &two
        } else {
            &many
        };
        let d = spec.run(profile, p)?;
        let r = ratio(&spec, profile, p)?;
        println!("{text:<50} atoms={:<2} ratio={:.6}", d.len(), r.ratio);
    }
    Ok(())
}
