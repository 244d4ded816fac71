// Reading an earthquake catalog with region and magnitude filters, and
// turning weekly case counts into event times.

use std::io::Write;

use vphawkes::io::{
    disaggregate_counts, read_catalog, CatalogFileSpec, CatalogFilter, CountMode, CumulativeCountSpec, Range,
};

pub fn run_example() -> vphawkes::Result<()> {
    let dir = std::env::temp_dir().join(format!("vphawkes-ingest-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;

    let quakes = dir.join("quakes.csv");
    let mut f = std::fs::File::create(&quakes)?;
    writeln!(f, "time,magnitude,latitude,longitude,depth")?;
    writeln!(f, "2004-01-01T03:00:00,3.2,36.5,-120.9,6.1")?;
    writeln!(f, "2004-01-01T03:00:00,3.4,36.6,-121.0,7.3")?;
    writeln!(f, "2004-01-02T10:30:00,2.7,36.7,-120.8,4.0")?;
    writeln!(f, "2004-01-05T00:00:00,4.1,38.0,-122.0,9.9")?;
    writeln!(f, "2004-01-09T12:00:00,3.0,36.9,-121.1,2.2")?;
    drop(f);

    let spec = CatalogFileSpec {
        filter: CatalogFilter {
            min_magnitude: Some(3.0),
            max_depth: Some(700.0),
            latitude: Some(Range::new(36.3, 37.2)),
            longitude: Some(Range::new(-120.3, -121.2)),
            time: None,
        },
        jitter_seed: 1,
        ..CatalogFileSpec::default()
    };
    let catalog = read_catalog(&quakes, &spec)?;
    println!("{} events kept, days since the first: {:?}", catalog.len(), catalog.times());

    let counts = dir.join("counts.csv");
    std::fs::write(&counts, "start,end,count\n2006-01-01,2006-01-08,12\n2006-01-08,2006-01-15,30\n2006-01-15,2006-01-22,41\n")?;
    let spec = CumulativeCountSpec {
        mode: CountMode::Cumulative,
        ..CumulativeCountSpec::default()
    };
    let cases = disaggregate_counts(&counts, &spec, 7)?;
    println!("{} cases placed on [0, {}] days", cases.len(), cases.window_end());

    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> vphawkes::Result<()> {
    run_example()
}
