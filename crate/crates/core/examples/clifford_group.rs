//! Enumerate small Clifford groups, look up products in the Cayley table and round-trip
//! the binary cache.

use qudit_rb::clifford::{clifford_group_order, decode_group, encode_group, enumerate_group};

fn main() -> qudit_rb::Result<()> {
    for (d, n) in [(2, 1), (3, 1), (5, 1), (2, 2)] {
        let g = enumerate_group(d, n)?;
        println!("d={d} n={n}: {} elements (closed form {})", g.len(), clifford_group_order(d, n));
    }

    let g = enumerate_group(3, 1)?;
    let (a, b) = (17, 123);
    let ab = g.prod(a, b);
    println!("element {a} then {b} = element {ab}; inverse of {ab} is {}", g.inv(ab));

    let bytes = encode_group(&g);
    let back = decode_group(&bytes)?;
    println!("cache: {} bytes, round trip equal: {}", bytes.len(), back.elements() == g.elements());
    Ok(())
}
