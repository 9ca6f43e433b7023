# Index policies
