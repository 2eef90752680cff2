# x + 1 mod 8
inputs 3
not 3 0
xor 4 1 0
and 5 1 0
xor 6 2 5
outputs 3 4 6
