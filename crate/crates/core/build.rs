fn main() {
    // zheevd_/zgemm_ come from the system OpenBLAS, which bundles BLAS and
    // LAPACK in a single shared object.
    println!("cargo:rustc-link-lib=dylib=openblas");
}
