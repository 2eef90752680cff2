# x - 1 mod 8
inputs 3
not 3 0
xor 4 1 3
not 5 1
and 6 5 3
xor 7 2 6
outputs 3 4 7
