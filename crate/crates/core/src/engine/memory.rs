//! Bit accounting for persisted agent state.

/// Width of an unsigned field ranging over `0..=max`: ⌈log₂(max+1)⌉.
pub fn bits_for(max: u64) -> u64 {
    if max == 0 {
        0
    } else {
        64 - u64::from(max.leading_zeros())
    }
}

/// Width of a port field ranging over `−1..=max_degree−1`.
pub fn port_bits(max_degree: usize) -> u64 {
    bits_for(max_degree as u64)
}

/// ⌈log₂ x⌉ for x ≥ 1.
pub fn ceil_log2(x: u64) -> u64 {
    if x <= 1 {
        0
    } else {
        64 - u64::from((x - 1).leading_zeros())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn widths() {
        assert_eq!(bits_for(0), 0);
        assert_eq!(bits_for(1), 1);
        assert_eq!(bits_for(9), 4);
        assert_eq!(bits_for(16), 5);
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(4), 2);
        assert_eq!(ceil_log2(5), 3);
        assert_eq!(ceil_log2(64), 6);
        assert_eq!(port_bits(3), 2);
    }
}
