//! Applies the modularity and normalized-Laplacian descriptors without
//! forming them, and shows the diagonally dominant shift.

use ellembed::{Descriptor, DescriptorOperator, Graph};
use ndarray::Array2;

fn main() -> ellembed::Result<()> {
    let g = Graph::from_index_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3)])?;
    let n = g.node_count();
    for kind in [Descriptor::Modularity, Descriptor::NormalizedLaplacian] {
        let op = DescriptorOperator::new(kind, &g)?;
        println!("{kind:?}");
        for i in 0..n {
            let row: Vec<String> = (0..n).map(|j| format!("{:+.4}", op.entry(i, j))).collect();
            println!("  {}", row.join(" "));
        }
        let shift = op.diagonal_shift_vector(0.0);
        println!("  shift {:?}", shift.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>());

        let k = op.shifted(0.0)?;
        let signs = Array2::from_shape_fn((n, 1), |(i, _)| if i < 3 { 1.0 } else { -1.0 });
        let ks = k.apply(signs.view())?;
        println!("  K s = {:?}", ks.iter().map(|v| format!("{v:+.4}")).collect::<Vec<_>>());
    }
    Ok(())
}
