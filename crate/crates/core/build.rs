fn main() {
    // LAPACK backend for the dense complex eigensolver (lax links against
    // whatever provides the *geev symbols; the distro openblas does).
    println!("cargo:rustc-link-lib=dylib=openblas");
}
