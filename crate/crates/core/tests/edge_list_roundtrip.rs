//! Edge-list serialisation keeps the network intact.

use std::io::Cursor;

use covert_core::graph::{parse_edge_list, write_edge_list, Network};
use proptest::prelude::*;

fn arbitrary_network() -> impl Strategy<Value = Network> {
    (2usize..40).prop_flat_map(|n| {
        proptest::collection::btree_set((0..n as u32, 0..n as u32), 0..120).prop_map(move |pairs| {
            let edges = pairs.into_iter().filter(|(a, b)| a < b);
            Network::from_edges(n, edges).unwrap()
        })
    })
}

fn sorted_edges(net: &Network) -> Vec<(u64, u64)> {
    let mut edges: Vec<(u64, u64)> = net
        .edges()
        .map(|(a, b)| {
            let a = net.external_id(a as usize).unwrap_or(a as u64);
            let b = net.external_id(b as usize).unwrap_or(b as u64);
            (a.min(b), a.max(b))
        })
        .collect();
    edges.sort_unstable();
    edges
}

proptest! {
    #[test]
    fn write_then_parse_preserves_edges_and_nodes(net in arbitrary_network()) {
        let mut buf = Vec::new();
        write_edge_list(&net, &mut buf).unwrap();
        let back = parse_edge_list(Cursor::new(buf)).unwrap();
        prop_assert_eq!(back.n(), net.n());
        prop_assert_eq!(back.edge_count(), net.edge_count());
        prop_assert_eq!(sorted_edges(&back), sorted_edges(&net));
        let mut a = net.degrees();
        let mut b = back.degrees();
        a.sort_unstable();
        b.sort_unstable();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn sparse_ids_survive_a_second_roundtrip(ids in proptest::collection::btree_set(0u64..1_000_000, 3..30)) {
        let ids: Vec<u64> = ids.into_iter().collect();
        let mut text = String::from("# path over sparse ids\n\n");
        for w in ids.windows(2) {
            text.push_str(&format!("{} {}\n", w[0], w[1]));
        }
        let net = parse_edge_list(Cursor::new(text)).unwrap();
        prop_assert_eq!(net.n(), ids.len());
        let mut buf = Vec::new();
        write_edge_list(&net, &mut buf).unwrap();
        let again = parse_edge_list(Cursor::new(buf)).unwrap();
        prop_assert_eq!(sorted_edges(&again), sorted_edges(&net));
        for (i, id) in ids.iter().enumerate() {
            prop_assert_eq!(again.external_id(i), Some(*id));
        }
    }
}

#[test]
fn malformed_lines_are_rejected() {
    for bad in ["1\n", "1 2 3\n", "a b\n", "-1 2\n", "4 4\n"] {
        assert!(parse_edge_list(Cursor::new(bad)).is_err(), "{bad:?}");
    }
}
