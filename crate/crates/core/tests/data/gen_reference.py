"""Regenerates bessel_reference.csv with mpmath at 40 significant digits."""
import mpmath as mp

mp.mp.dps = 40
orders = ["0", "0.25", "0.5", "1", "1.5", "2", "3.7", "5", "10", "20", "50", "100", "120"]
args = ["0.01", "0.1", "0.5", "1", "2", "3.9", "4.1", "5", "8", "10", "15", "20",
        "35", "50", "75", "100", "150", "200"]
print("nu,x,j,j_prime")
for nu in orders:
    for x in args:
        n, z = mp.mpf(nu), mp.mpf(x)
        j = mp.besselj(n, z)
        jp = mp.besselj(n, z, derivative=1)
        print(f"{nu},{x},{mp.nstr(j, 25, min_fixed=0, max_fixed=0)},{mp.nstr(jp, 25, min_fixed=0, max_fixed=0)}")
