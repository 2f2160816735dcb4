use std::fs;
use std::io::Write;
use std::path::Path;

use acceptmax_core::bounds::{ClassSampler, InstanceClass};
use acceptmax_core::schema::{AdcFile, InstanceFile};
use anyhow::Context;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Writes `count` seeded instances of `class`, as JSON lines on `out` or as
/// `<class>-n<n>-<i>.json` files under `out_dir`.
pub fn generate(
    class: &InstanceClass,
    n: u32,
    seed: u64,
    count: usize,
    out_dir: Option<&Path>,
    out: &mut dyn Write,
) -> anyhow::Result<()> {
    let sampler = ClassSampler::new(class, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    for i in 0..count {
        let file = InstanceFile::Adc(AdcFile::from(&sampler.sample(&mut rng)));
        match out_dir {
            Some(dir) => {
                let path = dir.join(format!("{}-n{n}-{i}.json", class.id()));
                let mut text = serde_json::to_string_pretty(&file)?;
                text.push('\n');
                fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
                writeln!(out, "{}", path.display())?;
            }
            None => {
                serde_json::to_writer(&mut *out, &file)?;
                writeln!(out)?;
            }
        }
    }
    Ok(())
}
