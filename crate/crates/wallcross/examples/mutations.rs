//! Mutations of exceptional collections at the level of integer Gram
//! matrices: unitriangularity is preserved, mutations invert each other,
//! and adjacent mutations satisfy the braid relation.
//!
//! Run with: `cargo run --example mutations`

use wallcross::kmut::{mat_mul_i64, ExceptionalCollection, Side};

fn show(name: &str, c: &ExceptionalCollection) {
    println!("{name}:");
    for row in c.gram() {
        println!("  {row:?}");
    }
}

fn main() -> wallcross::Result<()> {
    // the length-3 collection with pairings 3, 3, 6
    let c = ExceptionalCollection::new(vec![vec![1, 3, 6], vec![0, 1, 3], vec![0, 0, 1]])?;
    show("initial Gram", &c);

    let (left, m) = c.mutate(1, Side::Left)?;
    show("\nafter left mutation at slot 1", &left);
    println!("base change rows (new basis in old coordinates): {m:?}");

    let (back, m_inv) = left.mutate(1, Side::Right)?;
    show("\nright mutation undoes it", &back);
    assert_eq!(back.gram(), c.gram());
    let id = mat_mul_i64(&m_inv, &m)?;
    println!("composite base change: {id:?}");

    // braid relation: 0,1,0 equals 1,0,1 on both the Gram and the total
    // base change
    let route = |slots: &[usize]| -> wallcross::Result<_> {
        let mut cur = c.clone();
        let mut total = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        for &k in slots {
            let (next, m) = cur.mutate(k, Side::Left)?;
            total = mat_mul_i64(&m, &total)?;
            cur = next;
        }
        Ok((cur, total))
    };
    let (a, ma) = route(&[0, 1, 0])?;
    let (b, mb) = route(&[1, 0, 1])?;
    assert_eq!(a.gram(), b.gram());
    assert_eq!(ma, mb);
    show("\nbraid relation endpoint (both routes)", &a);
    Ok(())
}
