# t = g^(n)(s) with s = inputs 0 1 2 and n = inputs 3 4, then t0 xor s0
inputs 5
oracle n 3 4 s 0 1 2 t 5 6 7
xor 8 5 0
outputs 5 6 7 8
