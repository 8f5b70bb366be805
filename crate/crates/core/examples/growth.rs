use selfmeasure::radiation::cascade_growth;

fn main() {
    let bound = 1u64 << 40;
    for depth in 0..=12 {
        match cascade_growth(3, depth, bound) {
            Ok(n) => println!("generation {depth:>2}: {n} unmeasured particles"),
            Err(e) => println!("generation {depth:>2}: {e}"),
        }
    }
}
