//! Comparing an estimated partition with ground truth when both mark some
//! objects as noise.

use spc::evaluation::adjusted_rand_index;
use spc::{ari, ari_c, ari_n, s_n, ContingencyTable, LabeledPartition};

fn main() -> spc::Result<()> {
    let truth = LabeledPartition::new(vec![Some(0), Some(0), Some(0), Some(1), Some(1), Some(1), None, None]);
    let estimate = LabeledPartition::new(vec![Some(4), Some(4), Some(4), Some(7), Some(7), None, None, Some(7)]);

    let table = ContingencyTable::new(&estimate, &truth)?;
    println!("contingency table (last row/column is noise):");
    for row in table.counts() {
        println!("  {row:?}");
    }
    println!("ARI over all labels  {:.4}", ari(&table));
    println!("same, from labels    {:.4}", adjusted_rand_index(&estimate, &truth)?);
    println!("ARI_c (clusters)     {:?}", ari_c(&estimate, &truth)?);
    println!("ARI_n (noise)        {:.4}", ari_n(&estimate, &truth)?);
    println!("s_n                  {:.4}", s_n(&estimate, &truth)?);
    Ok(())
}
