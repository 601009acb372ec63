//! Synthetic inputs for the benchmarks.

use std::fmt::Write;

/// A cgo file with `funcs` functions, each making a few checked and unchecked C calls.
pub fn synthetic_cgo_file(funcs: usize) -> String {
    let mut src = String::from(
        "package bench\n\n/*\n#cgo LDFLAGS: -lm\n#include <stdlib.h>\n#include <string.h>\nvoid use(void *p) {}\n*/\nimport \"C\"\n\nimport \"unsafe\"\n\ntype pair struct {\n\ta, b int32\n}\n\ntype node struct {\n\tnext *node\n}\n\n",
    );
    for i in 0..funcs {
        writeln!(
            src,
            "func f{i}(s string, buf []byte, p *pair, q *node) C.int {{
\tcs := C.CString(s)
\tdefer C.free(unsafe.Pointer(cs))
\tvar n C.int = C.int(len(s))
\tC.memcpy(unsafe.Pointer(&buf[0]), unsafe.Pointer(cs), C.size_t(n))
\tC.use(unsafe.Pointer(p))
\tC.use(unsafe.Pointer(&n))
\tC.use(unsafe.Pointer(q))
\treturn n
}}\n"
        )
        .unwrap();
    }
    src
}

/// Heavy-tailed positive counts, deterministic in `n`.
pub fn skewed_counts(n: usize) -> Vec<f64> {
    (1..=n).map(|i| ((i * 7919) % 997 + 1) as f64 * if i % 10 == 0 { 40.0 } else { 1.0 }).collect()
}
