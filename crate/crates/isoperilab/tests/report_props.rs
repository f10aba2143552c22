use std::collections::BTreeMap;

use isoperilab::campaign::parse_range;
use isoperilab::report::{Grid, CSV_COLUMNS};
use isoperilab::{CampaignReport, Cell};
use proptest::prelude::*;

fn cell() -> impl Strategy<Value = Cell> {
    (
        1usize..8,
        any::<u64>(),
        any::<u64>(),
        prop::collection::btree_map("[a-z_]{1,8}", -1e6f64..1e6, 0..5),
        prop::collection::btree_map("[a-z]{1,6}", "[a-z ,;=\"]{0,12}", 0..3),
        prop::option::of("[a-z ]{1,10}"),
        prop::collection::vec("[a-z ,\"]{1,10}", 0..3),
    )
        .prop_map(|(n, param, seed, metrics, notes, skipped, failures)| {
            let mut c = Cell::new(0, "random", n, param, 0, seed);
            for (k, v) in metrics {
                c.metric(&k, v);
            }
            for (k, v) in notes {
                c.note(&k, v);
            }
            if let Some(s) = skipped {
                c.skip(s);
            }
            for f in failures {
                c.fail(f);
            }
            c
        })
}

fn report() -> impl Strategy<Value = CampaignReport> {
    (any::<u64>(), prop::collection::vec(cell(), 0..6)).prop_map(|(seed, mut cells)| {
        for (i, c) in cells.iter_mut().enumerate() {
            c.index = i;
        }
        let grid = Grid { n: vec![2, 3], params: vec![4, 8], trials: 1, samples: 0 };
        CampaignReport::new("theorem1", seed, grid, cells)
    })
}

proptest! {
    #[test]
    fn json_round_trips(r in report()) {
        let text = r.to_json();
        let back = CampaignReport::from_json(&text).unwrap();
        prop_assert_eq!(&back, &r);
        prop_assert_eq!(back.to_json(), text);
    }

    #[test]
    fn pass_counts_agree_with_cells(r in report()) {
        prop_assert_eq!(r.cells_failed, r.cells.iter().filter(|c| !c.passed).count());
        prop_assert_eq!(r.passed, r.cells.iter().all(|c| c.passed));
        for c in &r.cells {
            prop_assert_eq!(c.passed, c.failures.is_empty());
        }
    }

    #[test]
    fn csv_has_one_row_per_cell(r in report()) {
        let text = r.to_csv().unwrap();
        let mut rd = csv::Reader::from_reader(text.as_bytes());
        let header: Vec<String> = rd.headers().unwrap().iter().map(String::from).collect();
        let metrics: std::collections::BTreeSet<&String> = r.cells.iter().flat_map(|c| c.metrics.keys()).collect();
        prop_assert_eq!(&header[..CSV_COLUMNS.len()], &CSV_COLUMNS.map(String::from)[..]);
        prop_assert_eq!(header[CSV_COLUMNS.len()..].iter().collect::<Vec<_>>(), metrics.into_iter().collect::<Vec<_>>());
        let rows: Vec<csv::StringRecord> = rd.records().map(Result::unwrap).collect();
        prop_assert_eq!(rows.len(), r.cells.len());
        for (row, c) in rows.iter().zip(&r.cells) {
            let by_name: BTreeMap<&str, &str> = header.iter().map(String::as_str).zip(row.iter()).collect();
            prop_assert_eq!(by_name["seed"], c.seed.to_string());
            for (k, v) in &c.metrics {
                prop_assert_eq!(by_name[k.as_str()].parse::<f64>().unwrap(), *v);
            }
        }
    }

    #[test]
    fn ranges_are_inclusive(a in 0u64..1000, len in 0u64..50) {
        let b = a + len;
        let v = parse_range(&format!("{a}..{b}")).unwrap();
        prop_assert_eq!(v.len() as u64, len + 1);
        prop_assert_eq!(v.first().copied(), Some(a));
        prop_assert_eq!(v.last().copied(), Some(b));
        prop_assert_eq!(parse_range(&format!("{a}..={b}")).unwrap(), v);
    }
}
