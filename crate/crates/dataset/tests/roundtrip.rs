use dataset::{
    read_dataset, run_recording_episode, write_dataset, Dataset, Provenance, Sample, Schema,
};
use farm_sim::WorldConfig;
use proptest::prelude::*;

fn synthetic_dataset(n: usize) -> Dataset {
    let schema = Schema::default_farm();
    let samples = (0..n)
        .map(|i| {
            let mut features = Vec::with_capacity(schema.feature_count());
            for c in 0..schema.chargers {
                features.push(f64::from(u8::from((i + c) % 2 == 0)));
            }
            for d in 0..schema.drones {
                features.push((i as f64 * 0.017 + d as f64) % 1.0);
                features.push(i as f64 * 1.375 + d as f64 * 13.0);
                features.push(i as f64 * 0.625 + d as f64 * 7.0);
                features.push(((i + d) % 4) as f64);
            }
            for f in 0..schema.flocks {
                features.push(i as f64 * 0.333 + f as f64);
                features.push(i as f64 * 0.111 + f as f64 * 2.0);
            }
            let labels = (0..schema.label_count()).map(|d| ((i + d) % 6) as u8).collect();
            Sample { features, labels }
        })
        .collect();
    Dataset::new(
        schema,
        samples,
        Provenance {
            config_hash: "test".into(),
            base_seed: 1,
            episodes: 0,
            minutes_per_episode: 0,
        },
    )
}

#[test]
fn round_trip_is_exact_on_a_1k_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fixture.csv");
    let d = synthetic_dataset(1000);
    write_dataset(&d, &path).unwrap();
    let back = read_dataset(&path).unwrap();
    assert_eq!(d, back);

    // writing the read-back dataset reproduces the bytes
    let path2 = dir.path().join("fixture2.csv");
    write_dataset(&back, &path2).unwrap();
    assert_eq!(std::fs::read(&path).unwrap(), std::fs::read(&path2).unwrap());
}

#[test]
fn header_has_33_columns() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.csv");
    write_dataset(&synthetic_dataset(3), &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let header = text.lines().next().unwrap();
    assert_eq!(header.split(',').count(), 33);
}

#[test]
fn missing_label_column_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.csv");
    write_dataset(&synthetic_dataset(3), &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    // drop the last column from the header and every row
    let truncated: String = text
        .lines()
        .map(|l| {
            let mut cells: Vec<&str> = l.split(',').collect();
            cells.pop();
            cells.join(",") + "\n"
        })
        .collect();
    std::fs::write(&path, truncated).unwrap();
    // stale sidecar must not mask the missing column
    let err = read_dataset(&path).unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("label_drone3"), "unhelpful error: {msg}");
}

#[test]
fn bad_rows_report_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.csv");
    write_dataset(&synthetic_dataset(3), &path).unwrap();
    let mut text = std::fs::read_to_string(&path).unwrap();
    text.push_str("not,a,valid,row\n");
    std::fs::write(&path, text).unwrap();
    let err = read_dataset(&path).unwrap_err().to_string();
    assert!(err.contains("line 5"), "got: {err}");
}

#[test]
fn histograms_match_samples() {
    let d = synthetic_dataset(60);
    let h = d.histograms();
    for output in 0..4 {
        assert_eq!(h[output].iter().sum::<u64>(), 60);
        assert_eq!(h[output][0], 10);
    }
}

#[test]
fn recorded_episodes_are_deterministic() {
    let cfg = WorldConfig::default();
    let schema = Schema::default_farm();
    let a = run_recording_episode(&cfg, &schema, 1234, 30).unwrap();
    let b = run_recording_episode(&cfg, &schema, 1234, 30).unwrap();
    assert_eq!(a.samples, b.samples);
    assert_eq!(a.samples.len(), 30);
    assert_eq!(a.rejected, 0);
}

#[test]
fn recorded_labels_respect_field_capacities() {
    let cfg = WorldConfig::default();
    let schema = Schema::default_farm();
    let geom = scenario_farm::ScenarioGeometry::from_config(&cfg);
    let episode = run_recording_episode(&cfg, &schema, 77, 120).unwrap();
    for s in &episode.samples {
        for field in 0..schema.fields {
            let class = field as u8 + 1;
            let assigned = s.labels.iter().filter(|&&l| l == class).count();
            assert!(
                assigned <= geom.fields[field].required_drones,
                "field {field} got {assigned} drones"
            );
        }
    }
}

#[test]
fn split_is_deterministic_and_partitions() {
    let d = synthetic_dataset(100);
    let (train_a, test_a) = d.split(0.1, 99);
    let (train_b, test_b) = d.split(0.1, 99);
    assert_eq!(train_a, train_b);
    assert_eq!(test_a, test_b);
    assert_eq!(train_a.len(), 90);
    assert_eq!(test_a.len(), 10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// CSV round trip is exact for arbitrary float features.
    #[test]
    fn round_trip_arbitrary_floats(rows in prop::collection::vec(
        prop::collection::vec(-1e6f64..1e6, 29), 1..20
    )) {
        let schema = Schema::default_farm();
        let samples: Vec<Sample> = rows
            .into_iter()
            .map(|mut features| {
                for c in 0..schema.chargers {
                    features[c] = f64::from(u8::from(features[c] > 0.0));
                }
                for d in 0..schema.drones {
                    let col = schema.mode_column(d);
                    features[col] = (features[col].abs() as u64 % 4) as f64;
                }
                Sample { features, labels: vec![0, 1, 2, 3] }
            })
            .collect();
        let d = Dataset::new(schema, samples, Provenance::default());
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.csv");
        write_dataset(&d, &path).unwrap();
        let back = read_dataset(&path).unwrap();
        prop_assert_eq!(d, back);
    }
}
